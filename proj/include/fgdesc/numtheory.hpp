#pragma once

#include <cstdint>
#include <vector>

namespace fgdesc {

/// log m = min{ r : 2^r >= m }; the convention used for every length bound.
/// log 1 = 0, log 8 = 3, log 9 = 4.
int paper_log(long long m);

bool is_prime(long long n);

/// Prime factorization as (prime, exponent) pairs, ascending.
std::vector<std::pair<long long, int>> factorize(long long n);

/// Number of prime factors counted with multiplicity.
int lambda_omega(long long n);

/// q = p^n with p prime, n >= 1? Outputs p and n on success.
bool is_prime_power(long long q, long long* p, int* n);

std::vector<long long> divisors_of(long long n);

}  // namespace fgdesc
