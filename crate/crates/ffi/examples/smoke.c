/* Minimal C client: parse a document, run a suite, print the report. */
#include <stdio.h>
#include "mscheme.h"

int main(void) {
    const char *text =
        "ring Rx = poly x\n"
        "monoid M = ring Rx\n";
    MschDocument *doc = NULL;
    if (msch_document_parse(text, &doc) != MSCH_STATUS_OK) {
        fprintf(stderr, "%s\n", msch_last_error_message());
        return 2;
    }
    char *json = NULL;
    int32_t exit_code = 0;
    MschStatus st = msch_run_suite(doc, "integrality", 1, false, false, &json, &exit_code);
    if (st != MSCH_STATUS_OK) {
        fprintf(stderr, "%s\n", msch_last_error_message());
        msch_document_free(doc);
        return 2;
    }
    puts(json);
    msch_string_free(json);
    msch_document_free(doc);
    return exit_code;
}
