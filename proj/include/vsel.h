#ifndef VSEL_H
#define VSEL_H

/* C interface to the velocity-selection simulator.
 *
 * All numeric values cross this boundary in the library's internal units:
 * length um, time ms, velocity um/ms, energy as E/kB in nK.  Config files and
 * vsel_quantity() accept external units (G/cm, uK, ...) and convert.
 *
 * Every function returning int yields a vsel_status; on failure a
 * human-readable message is retrievable with vsel_last_error() (thread-local).
 */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
    VSEL_OK = 0,
    VSEL_ERR_USAGE = 1,   /* bad arguments to an API call */
    VSEL_ERR_CONFIG = 2,  /* malformed or inconsistent configuration */
    VSEL_ERR_NUMERIC = 3  /* a numerical guard aborted the run */
} vsel_status;

const char* vsel_version(void);

/* Message from the most recent failing call on this thread ("" if none). */
const char* vsel_last_error(void);

/* Opaque, validated run configuration. */
typedef struct vsel_config vsel_config;

int vsel_config_parse_file(const char* path, vsel_config** out);
int vsel_config_parse_text(const char* text, vsel_config** out);
/* Applies one key = value override with full validation. */
int vsel_config_set(vsel_config* cfg, const char* key, const char* value);
/* Canonical echo of the config in internal units; returns the number of bytes
 * that would be written (excluding the NUL), like snprintf. */
int vsel_config_echo(const vsel_config* cfg, char* buf, size_t bufsize);
void vsel_config_free(vsel_config* cfg);

/* Executes the configured engine; writes curve.csv, manifest.txt and any
 * snapshot files into out_dir. */
int vsel_run(const vsel_config* cfg, const char* out_dir);

/* Runs the classical and quantum engines over the same barrier list and
 * writes compare.csv plus a divergence summary into out_dir. */
int vsel_compare(const vsel_config* cfg, const char* out_dir);

typedef struct {
    int exists;
    double x_local_max_um;
    double x_local_min_um;
    double u_min_nk;
    double u_brim_nk;
    double u_eff_nk;
    double t_eff_nk;
    double omega_rad_per_ms;
    double e0_nk;
    double level_spacing_nk;
    double v_critical_um_ms;
    int bound_states_est;
} vsel_well_report;

/* Geometry of the selection well for U = g|x| + U0 exp(-(x-xD)^2/(2 w0^2)). */
int vsel_well_analysis(double gradient_nk_um, double u0_nk, double w0_um, double xd_um,
                       vsel_well_report* out);

/* Converts "<number> <unit>" to internal units for a given dimension:
 * "length", "time", "temperature", "velocity" or "gradient". */
int vsel_quantity(const char* text, const char* dimension, double* out_internal);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* VSEL_H */
