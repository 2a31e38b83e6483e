/* Scan the alpha = 4.3, r = 0.9 setting and print the detected events.
 *
 *   cargo build -p qutrit-dsd-ffi --release
 *   cc -I crates/ffi/include crates/ffi/examples/c/demo.c \
 *      target/release/libqutrit_dsd_ffi.a -lm -lpthread -ldl -o demo
 */
#include <stdio.h>

#include "qutrit_dsd.h"

static const char *kind_name(QdEventKind kind) {
    switch (kind) {
    case QD_EVENT_KIND_DSD: return "DSD";
    case QD_EVENT_KIND_DSB: return "DSB";
    case QD_EVENT_KIND_CCNR_POSITIVE: return "ccnr_positive";
    default: return "undetected";
    }
}

int main(void) {
    QdScanConfig cfg = {
        .alpha = 4.3, .r = 0.9, .variant = QD_VARIANT_AS_WRITTEN,
        .t_start = 0.0, .t_end = 0.3, .steps = 61, .refine_tol = 0.0,
    };
    QdTimeSeries *series = NULL;
    QdStatus st = qd_scan(&cfg, &series);
    if (st != QD_STATUS_OK) {
        fprintf(stderr, "scan failed: %s\n", qd_last_error());
        return 1;
    }
    QdEventList *events = NULL;
    st = qd_detect_events(series, &events);
    if (st != QD_STATUS_OK) {
        fprintf(stderr, "event detection failed: %s\n", qd_last_error());
        qd_time_series_free(series);
        return 1;
    }
    for (size_t i = 0; i < qd_event_list_len(events); i++) {
        QdEventWindow w;
        qd_event_list_get(events, i, &w);
        printf("%s %.6f %.6f\n", kind_name(w.kind), w.t_start, w.t_end);
    }
    qd_event_list_free(events);
    qd_time_series_free(series);
    return 0;
}
