#pragma once

#include <cstdint>
#include <gmpxx.h>

namespace heckelab {

/// Exact arbitrary-precision signed integer. Coefficients of weight-26 forms
/// pass 2^64 long before the default table bounds, so everything coefficient-
/// valued in this library is a ZZ.
using ZZ = mpz_class;

/// base^e for machine-sized nonnegative base and exponent.
inline ZZ zz_pow(std::int64_t base, unsigned long e) {
    ZZ r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(base), e);
    return r;
}

}  // namespace heckelab
