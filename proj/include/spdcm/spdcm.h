#ifndef SPDCM_SPDCM_H
#define SPDCM_SPDCM_H

/* C interface to the spdcm model library. Every call returns a status code;
 * on failure spdcm_last_error() describes the problem for the calling thread. */

#include <stddef.h>

#if defined(SPDCM_BUILDING_LIBRARY)
#define SPDCM_API __attribute__((visibility("default")))
#else
#define SPDCM_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum spdcm_status {
    SPDCM_OK = 0,
    SPDCM_ERR_PARSE = 1,      /* malformed config document */
    SPDCM_ERR_VALIDATION = 2, /* parameter out of range or inconsistent */
    SPDCM_ERR_DOMAIN = 3,     /* argument outside an operation's domain */
    SPDCM_ERR_NUMERIC = 4,    /* quadrature or iteration did not converge */
    SPDCM_ERR_IO = 5,
    SPDCM_ERR_ARGUMENT = 6,   /* null pointer, unknown name, bad index */
    SPDCM_ERR_INTERNAL = 7
} spdcm_status;

typedef struct spdcm_model spdcm_model;
typedef struct spdcm_image spdcm_image;
typedef struct spdcm_report spdcm_report;

SPDCM_API const char* spdcm_version(void);
SPDCM_API const char* spdcm_last_error(void);
SPDCM_API const char* spdcm_status_string(spdcm_status s);

/* ---- models ---- */

SPDCM_API spdcm_status spdcm_model_from_file(const char* path, spdcm_model** out);
SPDCM_API spdcm_status spdcm_model_from_string(const char* text, spdcm_model** out);
/* name: fig2, fig4 or fig5 */
SPDCM_API spdcm_status spdcm_model_from_preset(const char* name, spdcm_model** out);
SPDCM_API spdcm_status spdcm_model_clone(const spdcm_model* m, spdcm_model** out);
SPDCM_API void spdcm_model_free(spdcm_model* m);

/* Settable: photons, squeezing, G, seed_waist, pdc_angle, pump_phase,
 * seed_phase, exposure, orders, combination (0 coherent, 1 separate),
 * idler_model (0 tca, 1 series). Values in SI units and radians. */
SPDCM_API spdcm_status spdcm_model_set(spdcm_model* m, const char* name, double value);

/* Readable: everything settable plus omega_p, omega_d, k_d, kz_d, chi_d, Xi,
 * M0, M1, Omega0, eta, area, K_D, w0, beta, beta0, r0, R, X_peak, K_xi_x,
 * K_xi_y, X_xi_x, X_xi_y, a_peak, Omega3, background_peak, x_min, x_max,
 * y_min, y_max, nx, ny, noise_seed, length, focal_length. X_peak fails with
 * SPDCM_ERR_DOMAIN when r0^2 < R^2/2. */
SPDCM_API spdcm_status spdcm_model_get(const spdcm_model* m, const char* name, double* out);

typedef struct spdcm_components {
    double signal;
    double idler;
    double stimulated; /* signal and idler combined per the combination mode */
    double background;
    double total;
} spdcm_components;

/* Mean photon number at output-plane position (x, y) [m]. */
SPDCM_API spdcm_status spdcm_intensity(const spdcm_model* m, double x, double y, spdcm_components* out);

typedef struct spdcm_order_info {
    int order;
    int idler; /* 0 signal branch, 1 idler branch */
    double width;
    double bandwidth;
    double center_x; /* output-plane centre [m] */
    double center_y;
} spdcm_order_info;

SPDCM_API spdcm_status spdcm_order_info_get(const spdcm_model* m, int order, spdcm_order_info* out);
/* K_D |term_n(k_d X/f, omega_d)|^2 for a single thin-crystal-limit order. */
SPDCM_API spdcm_status spdcm_order_intensity(const spdcm_model* m, int order, double x, double y,
                                             double* out);

SPDCM_API spdcm_status spdcm_efficiency(double a, double beta, double* out);

/* ---- images ---- */

typedef struct spdcm_image_info {
    int nx, ny;
    double x_min, x_max, y_min, y_max; /* [m] */
    double total;
} spdcm_image_info;

/* Uses the pixel grid and exposure from the model's [run] section. */
SPDCM_API spdcm_status spdcm_image_synthesize(const spdcm_model* m, int poisson, unsigned long long seed,
                                              spdcm_image** out);
SPDCM_API spdcm_status spdcm_image_read(const char* path, spdcm_image** out);
SPDCM_API spdcm_status spdcm_image_write(const spdcm_image* img, const char* path);
SPDCM_API spdcm_status spdcm_image_info_get(const spdcm_image* img, spdcm_image_info* out);
/* Copies nx*ny values, row-major in y. */
SPDCM_API spdcm_status spdcm_image_values(const spdcm_image* img, double* buffer, size_t count);
SPDCM_API void spdcm_image_free(spdcm_image* img);

/* ---- fitting ---- */

#define SPDCM_FIT_MAX_PARAMS 5

typedef struct spdcm_fit_result {
    int count;
    char names[SPDCM_FIT_MAX_PARAMS][16];
    double values[SPDCM_FIT_MAX_PARAMS];
    double std_errors[SPDCM_FIT_MAX_PARAMS];
    double residual_norm;
    int iterations;
    int status; /* 0 converged, 1 max iterations, 2 not identifiable */
} spdcm_fit_result;

/* free_params: comma-separated names from photons, squeezing, G, seed_waist,
 * pdc_angle; NULL means photons,squeezing. init may be NULL, otherwise it
 * holds one start value per free parameter. The model's exposure converts
 * mean photon numbers to image counts. */
SPDCM_API spdcm_status spdcm_fit(const spdcm_model* m, const spdcm_image* img, const char* free_params,
                                 const double* init, spdcm_fit_result* out);
/* Seed-blocked image fixes squeezing, seeded image fixes the rest. */
SPDCM_API spdcm_status spdcm_fit_separate(const spdcm_model* m, const spdcm_image* background_only,
                                          const spdcm_image* combined, const char* free_params,
                                          spdcm_fit_result* out);

/* ---- validation ---- */

typedef struct spdcm_check {
    char name[48];
    double value;
    double tolerance;
    int pass;
    int informational;
    char note[160];
} spdcm_check;

/* full != 0 uses the 17x17x9 grid for every grid-based check. */
SPDCM_API spdcm_status spdcm_validate(const spdcm_model* m, int full, spdcm_report** out);
SPDCM_API size_t spdcm_report_count(const spdcm_report* r);
SPDCM_API spdcm_status spdcm_report_check(const spdcm_report* r, size_t index, spdcm_check* out);
SPDCM_API int spdcm_report_passed(const spdcm_report* r);
SPDCM_API const char* spdcm_report_text(const spdcm_report* r);
SPDCM_API void spdcm_report_free(spdcm_report* r);

/* ---- output ---- */

/* data is row-major, nrows x ncols. */
SPDCM_API spdcm_status spdcm_write_table(const char* path, const char* const* columns, size_t ncols,
                                         const double* data, size_t nrows);

typedef struct spdcm_series {
    const char* label;
    const double* x;
    const double* y;
    size_t length;
} spdcm_series;

SPDCM_API spdcm_status spdcm_write_plot(const char* path, const char* title, const char* x_label,
                                        const char* y_label, const spdcm_series* series, size_t count);

#ifdef __cplusplus
}
#endif

#endif
