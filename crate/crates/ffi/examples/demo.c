/* Ricci verdict of a catalog metric from C.
 *
 *   cargo build -p mlie-ffi --release
 *   cc examples/demo.c -Iinclude ../../target/release/libmlie_ffi.a -lpthread -ldl -lm -o demo
 *   ./demo L5_6 m56 eps=-1
 */
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "mlie.h"

static const char *verdict_name(MlieVerdict v) {
    switch (v) {
    case MLIE_VERDICT_EINSTEIN: return "Einstein";
    case MLIE_VERDICT_RICCI_FLAT: return "RicciFlat";
    case MLIE_VERDICT_FLAT: return "Flat";
    default: return "NotEinstein";
    }
}

int main(int argc, char **argv) {
    if (argc < 2) {
        fprintf(stderr, "usage: %s NAME [VARIANT [key=value ...]]\n", argv[0]);
        return 2;
    }
    const char *variant = argc > 2 ? argv[2] : NULL;
    int count = argc > 3 ? argc - 3 : 0;
    const char **keys = calloc(count + 1, sizeof *keys);
    double *values = calloc(count + 1, sizeof *values);
    for (int i = 0; i < count; i++) {
        char *eq = strchr(argv[i + 3], '=');
        if (!eq) {
            fprintf(stderr, "expected key=value, got %s\n", argv[i + 3]);
            return 2;
        }
        *eq = '\0';
        keys[i] = argv[i + 3];
        values[i] = atof(eq + 1);
    }

    MlieMetric *m = NULL;
    if (mlie_catalog_metric(argv[1], variant, keys, values, (size_t)count, &m) != MLIE_STATUS_OK) {
        fprintf(stderr, "error: %s\n", mlie_last_error());
        return 2;
    }
    MlieReport r;
    mlie_metric_classify(m, 1e-8, &r);
    MlieSubspaceInfo z;
    mlie_metric_center(m, 1e-9, &z);
    printf("dim %zu verdict %s lambda %.17g center dim %zu degenerate %d\n", mlie_metric_dim(m),
           verdict_name(r.verdict), r.lambda, z.dim, z.tag == MLIE_SUBSPACE_TAG_DEGENERATE);

    mlie_metric_free(m);
    free(keys);
    free(values);
    return 0;
}
