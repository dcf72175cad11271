/* Build: cargo build -p mobius-ffi --release
 *        cc examples/roundtrip.c -Iinclude -L../../target/release -lmobius_ffi -o roundtrip
 */
#include <stdio.h>
#include <string.h>

#include "mobius.h"

int main(void) {
    const char *msg = "attack at dawn";
    MobiusPlane *plane = NULL;
    MobiusBuffer *ct = NULL, *pt = NULL;

    MobiusStatus s = mobius_plane_new(2, 8, &plane);
    if (s != MOBIUS_OK) {
        fprintf(stderr, "plane: %s (%s)\n", mobius_status_str(s), mobius_last_error());
        return 1;
    }
    s = mobius_encrypt_seeded(plane, (const uint8_t *)msg, strlen(msg), 42, &ct);
    if (s == MOBIUS_OK)
        s = mobius_decrypt_seeded(mobius_buffer_data(ct), mobius_buffer_len(ct), 42, &pt);
    if (s != MOBIUS_OK) {
        fprintf(stderr, "%s: %s\n", mobius_status_str(s), mobius_last_error());
        return 1;
    }
    printf("container %zu bytes, plaintext \"%.*s\"\n", mobius_buffer_len(ct), (int)mobius_buffer_len(pt),
           (const char *)mobius_buffer_data(pt));

    s = mobius_decrypt_seeded(mobius_buffer_data(ct), 7, 42, &pt);
    printf("truncated: %s\n", mobius_status_str(s));

    mobius_buffer_free(pt);
    mobius_buffer_free(ct);
    mobius_plane_free(plane);
    return 0;
}
