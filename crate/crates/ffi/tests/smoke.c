#include <stdio.h>
#include <string.h>
#include "gluing.h"

static int fail(const char *what) {
    const char *msg = gl_last_error_message();
    fprintf(stderr, "%s: %s\n", what, msg ? msg : "(no message)");
    return 1;
}

int main(void) {
    GlFamily *fam = NULL;
    if (gl_family_from_fixture("example2", 3, &fam) != GL_STATUS_OK) return fail("load");

    size_t dim = 0;
    if (gl_family_pullback_dim(fam, &dim) != GL_STATUS_OK) return fail("dim");
    bool holds = true;
    if (gl_family_check_cocycle(fam, &holds) != GL_STATUS_OK) return fail("cocycle");

    char *report = NULL;
    GlStatus st = gl_family_check(fam, &report);
    if (report == NULL || strstr(report, "\"status\"") == NULL) return fail("report");
    gl_string_free(report);

    GlFamily *fixed = NULL;
    if (gl_family_repair(fam, &fixed) != GL_STATUS_OK) return fail("repair");
    bool fixed_holds = false;
    if (gl_family_check_cocycle(fixed, &fixed_holds) != GL_STATUS_OK) return fail("recheck");

    GlFamily *bad = NULL;
    GlStatus bad_st = gl_family_from_json("{\"kind\": 3}", &bad);
    const char *msg = gl_last_error_message();

    printf("dim=%zu cocycle=%d check=%d repaired=%d bad=%d msg=%d\n", dim, holds, st,
           fixed_holds, bad_st, msg != NULL);
    gl_family_free(fixed);
    gl_family_free(fam);
    gl_family_free(bad);
    return 0;
}
