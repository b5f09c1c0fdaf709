#include <math.h>
#include <stdio.h>
#include <string.h>

#include "qcoherence.h"

#define CHECK(cond)                                              \
    do {                                                         \
        if (!(cond)) {                                           \
            const char *msg = qc_last_error_message();           \
            fprintf(stderr, "line %d: %s (%s)\n", __LINE__, #cond, \
                    msg ? msg : "no error recorded");            \
            return 1;                                            \
        }                                                        \
    } while (0)

int main(void) {
    const char *plus = "{\"dims\":[2],\"matrix\":[[[0.5,0],[0.5,0]],[[0.5,0],[0.5,0]]]}";
    QcState *rho = NULL;
    CHECK(qc_state_from_json(plus, &rho) == QC_STATUS_OK);

    double c = 0.0;
    CHECK(qc_coherence(rho, QC_MEASURE_REL_ENTROPY, &c) == QC_STATUS_OK);
    CHECK(fabs(c - 1.0) < 1e-12);

    QcChannel *erase = NULL;
    CHECK(qc_channel_from_json("{\"name\":\"erasing\",\"dim\":2}", &erase) == QC_STATUS_OK);
    QcState *out = NULL;
    CHECK(qc_channel_apply(erase, rho, &out) == QC_STATUS_OK);
    CHECK(qc_coherence(out, QC_MEASURE_L1, &c) == QC_STATUS_OK);
    CHECK(c == 0.0);

    char *json = NULL;
    CHECK(qc_state_to_json(out, &json) == QC_STATUS_OK);
    CHECK(strstr(json, "\"dims\":[2]") != NULL);
    qc_string_free(json);

    QcState *bad = NULL;
    CHECK(qc_state_from_json("{\"dims\":[2],\"matrix\":[[[2,0],[0,0]],[[0,0],[-1,0]]]}", &bad)
          == QC_STATUS_INVALID_STATE);
    CHECK(bad == NULL);
    CHECK(strstr(qc_last_error_message(), "residual") != NULL);

    qc_state_free(out);
    qc_state_free(rho);
    qc_channel_free(erase);
    puts("ok");
    return 0;
}
