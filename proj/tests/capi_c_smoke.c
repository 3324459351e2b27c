/* The public header must compile as C and link against the shared library. */
#include <stdio.h>

#include "rtfm/rtfm.h"

int main(void)
{
    const double scores[] = {3.0, 2.0, 1.0};
    double out = 0;
    rtfm_config* config = NULL;
    char* hash = NULL;

    if (rtfm_rss(scores, 3, &out) != RTFM_OK || out < 4.66 || out > 4.67)
        return 1;
    if (rtfm_config_new(&config) != RTFM_OK)
        return 1;
    if (rtfm_config_hash(config, &hash) != RTFM_OK)
        return 1;
    printf("rtfm %s config %s\n", rtfm_version(), hash);
    rtfm_string_free(hash);
    rtfm_config_free(config);
    return 0;
}
