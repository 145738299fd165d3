#include <math.h>
#include <stdio.h>

#include "lindblad_lab.h"

int main(void) {
    /* A = sigma_z: Hilbert rate 8, Liouville rate 4. */
    const double sz[8] = {1, 0, 0, 0, 0, 0, -1, 0};
    const double plus[8] = {0.5, 0, 0.5, 0, 0.5, 0, 0.5, 0};
    LindbladModelHandle *model = NULL;
    LindbladTrajectoryHandle *tr = NULL;
    double h = 0, l = 0;
    size_t len = 0;
    LindbladObservables last;

    if (lindblad_model_new(2, NULL, 0, sz, 1, &model) != LINDBLAD_STATUS_OK) return 1;
    if (lindblad_hilbert_rate(model, 0.0, &h) != LINDBLAD_STATUS_OK || fabs(h - 8.0) > 1e-12) return 2;
    if (lindblad_liouville_rate(model, 0.0, &l) != LINDBLAD_STATUS_OK || fabs(l - 4.0) > 1e-12) return 3;
    if (lindblad_integrate(model, plus, 0.0, 1.0, 1e-3, 100, &tr) != LINDBLAD_STATUS_OK) return 4;
    if (lindblad_trajectory_len(tr, &len) != LINDBLAD_STATUS_OK || len != 11) return 5;
    if (lindblad_trajectory_observables(tr, len - 1, &last) != LINDBLAD_STATUS_OK) return 6;
    if (fabs(last.purity - (0.5 + 0.5 * exp(-4.0))) > 1e-9) return 7;
    if (lindblad_trajectory_observables(tr, len, &last) != LINDBLAD_STATUS_OUT_OF_RANGE) return 8;
    if (lindblad_last_error_message() == NULL) return 9;
    lindblad_trajectory_free(tr);
    lindblad_model_free(model);
    printf("ok\n");
    return 0;
}
