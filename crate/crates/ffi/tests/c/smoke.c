#include <stdio.h>
#include <string.h>

#include "counterpoint.h"

int main(void) {
    CpDichotomy *x6 = NULL;
    CpDichotomy *x12 = NULL;
    CpSuccessorSet *set = NULL;
    const uint32_t members[] = {0, 2, 3};

    if (cp_dichotomy_new(6, members, 3, &x6) != CP_STATUS_OK) return 1;
    if (cp_symmetries(x6, 0, 2, &set) != CP_STATUS_OK) return 2;
    if (cp_successor_set_cardinality(set) != 15) return 3;
    CpSymmetry g;
    if (cp_successor_set_symmetry(set, 0, &g) != CP_STATUS_OK || g.t != 3 || g.u != 1 || g.v != 3) return 4;
    cp_successor_set_free(set);

    if (cp_dichotomy_parse(12, "X12", &x12) != CP_STATUS_OK) return 5;
    if (cp_extend(x6, x12, 2, 2, CP_LINKAGE_INTERVAL, &set) != CP_STATUS_OK) return 6;
    if (cp_successor_set_cardinality(set) != 48) return 7;
    cp_successor_set_free(set);

    if (cp_symmetries(x6, 0, 1, &set) != CP_STATUS_NOT_CONSONANT) return 8;
    if (strstr(cp_last_error_message(), "not consonant") == NULL) return 9;

    int64_t num = 0, den = 0;
    if (cp_continuum_measure(3, 8, &num, &den) != CP_STATUS_OK || num != 3 || den != 8) return 10;

    char *json = NULL;
    if (cp_dichotomy_analyze_json(x6, &json) != CP_STATUS_OK) return 11;
    printf("%s\n", json);
    cp_string_free(json);

    cp_dichotomy_free(x12);
    cp_dichotomy_free(x6);
    return 0;
}
