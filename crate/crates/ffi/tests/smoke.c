#include <stdio.h>
#include <string.h>
#include "h3cycles.h"

int main(void) {
    H3Graph *g = NULL;
    if (h3_graph_complete(5, &g) != H3_STATUS_OK) return 10;
    size_t n = 0, m = 0;
    if (h3_graph_size(g, &n, &m) != H3_STATUS_OK || n != 5 || m != 10) return 11;
    bool ok = false;
    if (h3_check_divisibility(g, H3_DIVISIBILITY_CYCLE, 5, &ok) != H3_STATUS_OK || !ok) return 12;
    char *json = NULL;
    if (h3_exact_decompose(g, 5, 1000000, &json) != H3_STATUS_OK) return 13;
    if (strstr(json, "\"Complete\"") == NULL) return 14;
    h3_string_free(json);
    h3_graph_free(g);
    if (h3_graph_parse("3graph 3 1\n0 1 5\n", &g) != H3_STATUS_PARSE) return 15;
    if (strlen(h3_last_error_message()) == 0) return 16;
    printf("ok %s\n", h3_version());
    return 0;
}
