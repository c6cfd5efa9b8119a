#pragma once

// Every translation unit must see httplib with the same feature set, or the
// inline client/server definitions silently diverge. Include this header
// instead of <httplib.h> directly.
#ifdef GROUNDKIT_HAS_OPENSSL
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include <httplib.h>
