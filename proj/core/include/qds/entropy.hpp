#pragma once

namespace qds {

// Binary entropy in bits; p must lie in [0,1].  Endpoints return 0.
double binary_entropy(double p);

// Left inverse of binary_entropy: the unique p in [0, 0.5] with H2(p) = y.
double inverse_binary_entropy(double y);

// log2(2^a + 2^b) without overflow, tolerating -inf for "zero" terms.
double logadd2(double a, double b);

// log2(C(n,k)) for real-valued n >= k >= 0 via lgamma.
double log2_binomial(double n, double k);

}  // namespace qds
