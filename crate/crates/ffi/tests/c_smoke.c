#include <stdio.h>
#include "ffjac.h"

#define CHECK(call)                                                       \
    do {                                                                  \
        FfjacStatus s_ = (call);                                          \
        if (s_ != FFJAC_STATUS_OK) {                                      \
            fprintf(stderr, "%s: %s (%s)\n", #call, ffjac_status_str(s_), \
                    ffjac_last_error());                                  \
            return 1;                                                     \
        }                                                                 \
    } while (0)

int main(void) {
    /* y^2 = x^5 + 1 over F_7 */
    int64_t coeffs[] = {-1, 0, 0, 0, 0, -1};
    uintptr_t lens[] = {6, 0};
    FfjacField *f = NULL;
    FfjacJacobian *jac = NULL;
    FfjacClass *a = NULL, *na = NULL, *s = NULL;
    uint32_t g = 0;
    bool zero = false;

    CHECK(ffjac_field_new(7, coeffs, lens, 2, &f));
    CHECK(ffjac_field_genus(f, &g));
    CHECK(ffjac_jacobian_new(f, FFJAC_STRATEGY_LINEAR, true, &jac));
    CHECK(ffjac_class_random(jac, 42, &a));
    CHECK(ffjac_class_neg(jac, a, &na));
    CHECK(ffjac_class_add(jac, a, na, &s));
    CHECK(ffjac_class_is_zero(s, &zero));
    printf("genus %u zero %d\n", g, zero);

    ffjac_class_free(a);
    ffjac_class_free(na);
    ffjac_class_free(s);
    ffjac_jacobian_free(jac);
    ffjac_field_free(f);
    return (g == 2 && zero) ? 0 : 1;
}
