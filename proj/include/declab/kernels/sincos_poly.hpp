#pragma once

namespace declab::kernels::poly {

// Taylor coefficients of sin(2*pi*r) and cos(2*pi*r) as polynomials in r,
// valid on the reduced octant r in [-1/8, 1/8]. Truncation error at the
// endpoint is 8.3e-20 (sin) / 3.3e-21 (cos); results are rounding-limited.
inline constexpr double S[9] = {
    0x1.921fb54442d18p+2,   // (2pi)^1/1!
    -0x1.4abbce625be53p+5,  // -(2pi)^3/3!
    0x1.466bc6775aae2p+6,   // (2pi)^5/5!
    -0x1.32d2cce62bd86p+6,  // -(2pi)^7/7!
    0x1.50783487ee782p+5,   // (2pi)^9/9!
    -0x1.e3074fde8871fp+3,  // -(2pi)^11/11!
    0x1.e8f434d018d63p+1,   // (2pi)^13/13!
    -0x1.6fadb9f155744p-1,  // -(2pi)^15/15!
    0x1.aaec32af93359p-4,   // (2pi)^17/17!
};

inline constexpr double C[10] = {
    0x1.0000000000000p+0,   // 1
    -0x1.3bd3cc9be45dep+4,  // -(2pi)^2/2!
    0x1.03c1f081b5ac4p+6,   // (2pi)^4/4!
    -0x1.55d3c7e3cbffap+6,  // -(2pi)^6/6!
    0x1.e1f506891babbp+5,   // (2pi)^8/8!
    -0x1.a6d1f2a204a8cp+4,  // -(2pi)^10/10!
    0x1.f9d38a3763cc3p+2,   // (2pi)^12/12!
    -0x1.b6e24f44b128fp+0,  // -(2pi)^14/14!
    0x1.20c62c2f2d7f5p-2,   // (2pi)^16/16!
    -0x1.2a0c591af8314p-5,  // -(2pi)^18/18!
};

}  // namespace declab::kernels::poly
